import rospy
import smach

from robot_skills.arm import CarryPose, PoseArm
from robot_skills.gripper import CloseGripper, OpenGripper, WaitForGrasp
from robot_skills.speech import Say


class HandoverFromHuman(smach.StateMachine):
    """Receive an object from a human with spoken gripper commands."""

    def __init__(self, robot, arm_designator):
        smach.StateMachine.__init__(self, outcomes=['succeeded', 'failed'])
        self.robot = robot
        with self:
            smach.StateMachine.add('POSE_ARM',
                                   PoseArm(robot, arm_designator, 'receive'),
                                   transitions={'posed': 'SAY_OPEN',
                                                'failed': 'SAY_END'})

            smach.StateMachine.add('SAY_OPEN',
                                   Say(robot, 'I am going to open my gripper now.'),
                                   transitions={'spoken': 'OPEN_GRIPPER'})

            smach.StateMachine.add('OPEN_GRIPPER',
                                   OpenGripper(robot, arm_designator),
                                   transitions={'opened': 'SAY_HANDOVER',
                                                'stuck': 'SAY_END'})

            smach.StateMachine.add('SAY_HANDOVER',
                                   Say(robot, 'Please place the object in my gripper.'),
                                   transitions={'spoken': 'WAIT_GRASP'})

            smach.StateMachine.add('WAIT_GRASP',
                                   WaitForGrasp(robot, arm_designator, timeout=10.0),
                                   transitions={'grasped': 'CLOSE_GRIPPER',
                                                'timeout': 'SAY_HANDOVER'})

            smach.StateMachine.add('CLOSE_GRIPPER',
                                   CloseGripper(robot, arm_designator),
                                   transitions={'closed': 'SAY_CLOSE'})

            smach.StateMachine.add('SAY_CLOSE',
                                   Say(robot, 'I am closing my gripper now.'),
                                   transitions={'spoken': 'CARRY_POSE'})

            smach.StateMachine.add('CARRY_POSE',
                                   CarryPose(robot, arm_designator),
                                   transitions={'done': 'SAY_END'})

            smach.StateMachine.add('SAY_END',
                                   Say(robot, 'Thank you, I have the object.'),
                                   transitions={'spoken': 'succeeded'})


if __name__ == '__main__':
    rospy.init_node('handover_from_human')
    sm = HandoverFromHuman(None, None)
    sm.execute()
