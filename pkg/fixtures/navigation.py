import rospy
import smach

from robot_skills.navigation import EnterRoom, Navigate, OpenDoor
from robot_skills.speech import Say


class RobotNavigation(smach.StateMachine):
    """Drive to the destination room, opening the door on the way."""

    def __init__(self, robot, destination):
        smach.StateMachine.__init__(self, outcomes=['arrived'])
        self.robot = robot
        with self:
            smach.StateMachine.add('IDLE',
                                   Say(robot, 'Waiting for the start command.'),
                                   transitions={'start_command': 'NAVIGATE'})

            smach.StateMachine.add('NAVIGATE',
                                   Navigate(robot, destination),
                                   transitions={'reached_door': 'OPEN_DOOR',
                                                'obstacle_detected': 'NAVIGATE'})

            smach.StateMachine.add('OPEN_DOOR',
                                   OpenDoor(robot),
                                   transitions={'door_opened': 'ENTER_ROOM',
                                                'failed_to_open_door': 'OPEN_DOOR'})

            smach.StateMachine.add('ENTER_ROOM',
                                   EnterRoom(robot, destination),
                                   transitions={'room_entered': 'DESTINATION'})

            smach.StateMachine.add('DESTINATION',
                                   Say(robot, 'I have arrived.'),
                                   transitions={'spoken': 'arrived'})


if __name__ == '__main__':
    rospy.init_node('robot_navigation')
    sm = RobotNavigation(None, 'kitchen')
    sm.execute()
