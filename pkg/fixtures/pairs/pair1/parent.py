import rospy
import smach

from robot_skills.navigation import NavigateToRoom, NavigateToWaypoint, SelectArea
from robot_skills.perception import FindPerson


class LocatePerson(smach.StateMachine):
    """Navigate to the designated area and look for a person there."""

    def __init__(self, robot, area_designator, found_person_designator):
        smach.StateMachine.__init__(self, outcomes=['succeeded', 'failed'])
        self.robot = robot
        with self:
            smach.StateMachine.add('SELECT_AREA',
                                   SelectArea(robot, area_designator),
                                   transitions={'waypoint': 'NAVIGATE_TO_WAYPOINT',
                                                'room': 'NAVIGATE_TO_ROOM'})

            smach.StateMachine.add('NAVIGATE_TO_WAYPOINT',
                                   NavigateToWaypoint(robot, area_designator),
                                   transitions={'arrived': 'FIND_PERSON',
                                                'unreachable': 'failed'})

            smach.StateMachine.add('NAVIGATE_TO_ROOM',
                                   NavigateToRoom(robot, area_designator),
                                   transitions={'arrived': 'FIND_PERSON',
                                                'unreachable': 'failed'})

            smach.StateMachine.add('FIND_PERSON',
                                   FindPerson(robot, found_person_designator),
                                   transitions={'found': 'succeeded',
                                                'not_found': 'failed'})


if __name__ == '__main__':
    rospy.init_node('locate_person')
    sm = LocatePerson(None, None, None)
    sm.execute()
